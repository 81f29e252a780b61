# Parallel NCSP Solver Package
