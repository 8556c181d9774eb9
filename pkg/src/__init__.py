# Laplacian pinning model: exact values, renewal solvers, disorder averages and certificates