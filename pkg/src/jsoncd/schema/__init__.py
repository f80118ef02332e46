"""Schema documents, normalization, validation and corpus ingestion."""
