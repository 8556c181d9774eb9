# Model tests