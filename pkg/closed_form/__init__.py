# Closed form package
# Contains explicit p-norm and proportional-axis models
