"""Rolling-subtree classification trees.

Grows binary classification trees by repeatedly solving an exact 2-depth
(optionally 3-depth) optimal tree problem at a frontier node, committing one
level, and rolling down. Ships misclassification and Gini losses, the CART
baselines, the hybrid strategy and a cross-validation benchmark harness.
"""

__version__ = "0.1.0"
