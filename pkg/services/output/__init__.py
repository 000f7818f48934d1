# CSV/JSON serialization of command results
