"""Running the JSON Schema Test Suite through the engine."""
