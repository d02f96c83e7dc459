# Command routers
