from .types import ContactModel, ImpedanceGains, ProbeParams, ProbeState, TaskError
from .controller import contact_force, impedance_wrench, storage_function, task_error
from .dynamics import quat_rotate, quat_to_matrix, step_dynamics

__all__ = [
    "ProbeState", "TaskError", "ImpedanceGains", "ContactModel", "ProbeParams",
    "task_error", "impedance_wrench", "contact_force", "storage_function",
    "step_dynamics", "quat_rotate", "quat_to_matrix",
]
