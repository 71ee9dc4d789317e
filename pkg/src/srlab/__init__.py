"""srlab: alternating-cycle graph machinery, free-group/HNN/amalgam word
calculus, bounded mutual-reduction checking, and group-ring support
experiments, with a certificate-emitting CLI."""

__version__ = "0.1.0"
