# CLI App Package
