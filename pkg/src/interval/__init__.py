# Interval arithmetic package
