# Grid App Package
