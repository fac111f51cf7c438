"""
可复现的随机数流
"""
from dataclasses import dataclass, field

import numpy as np


@dataclass
class RngState:
    """
    (seed, stream) 唯一确定一条 PCG64 流;
    child(i) 派生互不相关的子流, 供并行试验使用
    """
    seed: int
    stream: int = 0
    _generator: np.random.Generator = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        seq = np.random.SeedSequence(entropy=int(self.seed), spawn_key=(int(self.stream),))
        self._generator = np.random.Generator(np.random.PCG64(seq))

    @property
    def generator(self) -> np.random.Generator:
        return self._generator

    def child(self, index: int) -> "RngState":
        # 子流编号与父流错开, 避免 child(i) 与 RngState(seed, i) 重合
        return RngState(seed=self.seed, stream=(int(self.stream) + 1) * 1_000_003 + int(index))
