# Model package
# Contains the implicit level-equation models and solver
