"""ALPINE: active learning for link prediction in partially observed networks"""
