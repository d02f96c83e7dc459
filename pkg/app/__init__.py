# App package - command line surface for the magic engine
