"""Bundled example configs, one per shipped pattern family."""
