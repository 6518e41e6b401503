# API package
# Contains the Flask JSON service
