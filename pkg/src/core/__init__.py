"""Model types, potential functions and the moving-centre dynamics."""
