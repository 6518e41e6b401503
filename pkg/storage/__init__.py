# Storage package
# Contains model config loading and output writing
