# Parallel solver package
