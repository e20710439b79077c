# Clocks app package
