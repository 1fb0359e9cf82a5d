# Oracles package
