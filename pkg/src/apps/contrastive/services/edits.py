"""src/apps/contrastive/services/edits.py."""

from typing import List, Sequence


def delete_token(tokens: Sequence[str], position: int) -> List[str]:
    """Removes the token at position."""
    return list(tokens[:position]) + list(tokens[position + 1:])


def insert_token(tokens: Sequence[str], position: int, token: str) -> List[str]:
    """Inserts token so that it ends up at position."""
    return list(tokens[:position]) + [token] + list(tokens[position:])


def replace_token(tokens: Sequence[str], position: int, token: str) -> List[str]:
    """Swaps the token at position."""
    edited = list(tokens)
    edited[position] = token
    return edited
