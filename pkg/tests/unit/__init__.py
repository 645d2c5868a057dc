"""
Unit tests for Virtual Client project
"""
