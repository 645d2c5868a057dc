"""
Test package for Virtual Client project
"""
