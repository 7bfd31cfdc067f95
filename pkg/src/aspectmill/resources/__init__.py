"""随包发布的默认标签体系与否定词典"""
