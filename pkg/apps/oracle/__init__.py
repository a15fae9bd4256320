# Oracle App Package
