# Qubits app package
