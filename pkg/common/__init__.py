# Common package
# Contains errors, settings and root finding
