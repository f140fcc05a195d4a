"""
应用层：流水线编排和运行报告
"""
