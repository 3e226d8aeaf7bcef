"""framekit: paraphrastic FrameNet augmentation, argument identification and evaluation."""

__version__ = "0.1.0"
