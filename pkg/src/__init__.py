# 影子顶点单纯形求解器
