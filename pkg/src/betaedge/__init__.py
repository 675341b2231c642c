"""betaedge: a numerical laboratory for beta-ensemble edge dynamics.

Samplers and SDE integrators for the classical eigenvalue processes,
edge rescaling machinery, and experiments that test the Airy-type
structure of the limiting line ensemble through its Stieltjes transform.
"""

__version__ = "0.1.0"
