"""Export handlers"""
