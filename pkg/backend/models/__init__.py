"""Pydantic models for reports and job configuration"""
