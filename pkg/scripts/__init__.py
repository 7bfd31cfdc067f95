"""
aspectmill 辅助脚本
"""

# 这个包包含了生成测试语料等辅助脚本
