# Stencil App Package
