# Contractor package
