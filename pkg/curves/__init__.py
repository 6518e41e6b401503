# Curves package
# Contains principal-axis B-H curves and energy profiles
