# Analysis package
# Contains duality, contour, locus and convexity tools
