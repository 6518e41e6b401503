# Law package
# Contains material laws and differential tensors
