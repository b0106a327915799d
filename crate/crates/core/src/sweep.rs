//! Placeholder; replaced next.
