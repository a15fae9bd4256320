# SGML Apps Package
