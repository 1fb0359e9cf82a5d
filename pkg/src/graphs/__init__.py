# Graphs package
