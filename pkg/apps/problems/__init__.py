# Problems App Package
