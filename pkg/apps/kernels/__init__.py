# Kernels App Package
