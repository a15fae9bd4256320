# SGML Configuration Package
