""" This file creates event notification signals for Flask-GridTree.
    Signals are based on Flask.signals which are based on the blinker signals.
"""

# Copyright (c) 2024 GridTree developers


from flask.signals import Namespace

_signals = Namespace()                              # Place Flask-GridTree signals in our own namespace

__all__ = ['tree_built', 'cluster_split', 'tick_completed', 'transmission_dropped', 'run_finished']

# Sent by GridTreeManager after a deployment's index tree was built. kwargs: deployment
tree_built = _signals.signal('gridtree.tree_built')

# Sent by GridTreeManager for every split cluster. kwargs: cluster, subclusters
cluster_split = _signals.signal('gridtree.cluster_split')

# Sent by run() after every tick. kwargs: state, ledger (this tick's charges only)
tick_completed = _signals.signal('gridtree.tick_completed')

# Sent by run() for every transmission that could not be paid for. kwargs: event
transmission_dropped = _signals.signal('gridtree.transmission_dropped')

# Sent by run() when the last tick completed. kwargs: result
run_finished = _signals.signal('gridtree.run_finished')
