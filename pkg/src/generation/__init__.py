# Instance generation package
