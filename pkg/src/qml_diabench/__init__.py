"""Hybrid quantum/classical benchmark on the Pima diabetes data.

Pipeline: clean and split the table, reduce with PCA or LDA, encode into
qubits on the bundled statevector simulator, and score QSVC, VQC and four
classical baselines on precision, recall, F1 and balanced accuracy.
"""

__version__ = "0.1.0"
