"""sumlab: a self-hostable workbench for applying and evaluating
text summarization models."""

__version__ = "0.1.0"
