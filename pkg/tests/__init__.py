"""
aspectmill 测试
"""
