"""Resource bounds shared by all modules."""

from dataclasses import dataclass, asdict


@dataclass
class Config:
    order_bound: int = 20160  # largest group stored as a Cayley table
    iso_bound: int = 2000  # largest order for backtracking isomorphism search
    max_cosets: int = 1_000_000
    generator_bound: int = 4096  # largest tensor presentation (generators)
    symmetric_bound: int = 20160

    def as_dict(self):
        return asdict(self)


DEFAULT = Config()
