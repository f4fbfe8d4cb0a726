"""Byzantine-robust gossip simulator - CG+ and sparse NNA aggregation on sparse graphs."""

__version__ = "0.1.0"
