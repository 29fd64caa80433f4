from django.dispatch import Signal

# sent with ``config``
restoration_started = Signal()
# sent with ``report``
restoration_finished = Signal()
# sent with ``iteration`` and ``group`` (0..3: Z1, Z2, W, T)
solver_restarted = Signal()
