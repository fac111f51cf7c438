# 数据模型
