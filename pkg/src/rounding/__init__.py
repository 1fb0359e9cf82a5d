# Rounding package
