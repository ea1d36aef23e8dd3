"""Upper/lower Hardy-space decomposition of L^p (0 < p < 1) line functions.

Subpackages cover the Cayley correspondence (cayley), Laurent-rational atoms
and pole certification (rational), singular L^p quadrature (quadrature), the
constructive atom pipelines (approx), the phi-parametrized splitting and the
full decomposition driver (split), interior extensions (hardy), Fourier
spectrum verification (spectral), a named corpus of exact test functions
(corpus), and the command-line front door (cli).
"""

__version__ = "0.1.0"
