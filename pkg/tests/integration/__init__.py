"""
Integration tests for Virtual Client project
"""
