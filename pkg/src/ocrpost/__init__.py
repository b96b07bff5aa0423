"""ocrpost: post-OCR correction for historical documents.

Pipeline: acquire text (file or external OCR command), rejoin hyphen line
splits, flag suspicious tokens, generate replacement candidates (confusable
characters, word splits, fuzzy lexicon matches), pick the variant with the
lowest n-gram perplexity, and emit corrected text plus a reviewable edit
ledger.
"""

__version__ = "0.1.0"
