"""consec-poset: intervals of the consecutive pattern poset."""
