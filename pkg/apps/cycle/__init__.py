# Cycle App Package
