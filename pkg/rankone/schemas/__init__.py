"""Pydantic request and report schemas."""
