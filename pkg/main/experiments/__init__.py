# Experiment runners
