"""Coverage, compliance and efficiency benchmarking."""
