"""freecomp: free-component computations for quantum states and channels.

Computes the largest free weight gamma that a noisy state or channel
majorizes, for pluggable free-set descriptions (diagonal states, vertex
hulls, a Gibbs singleton, PPT Choi sets), and evaluates the matching
lower bounds on purification error, distillation overhead, simulation
cost, error-correction accuracy, capacity trade-offs, and noisy gate
counts.
"""

from freecomp._kernels import BACKEND as kernel_backend

__version__ = "0.1.0"

__all__ = ["kernel_backend", "__version__"]
