# Settings Package
