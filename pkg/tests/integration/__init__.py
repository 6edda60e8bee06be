"""End-to-end runs of the blow-up pipeline and the command line."""
