"""The default state battery used by the verification suite."""

DEFAULT_BATTERY = (
    "vacuum",
    "coherent:1",
    "coherent:0.5+0.5j",
    "coherent:0.7+0.2j",
    "squeezed_vacuum:0.5",
    "squeezed_vacuum:0.75,1.2",
    "ideal_squeezed:0.5+0.3j,0.4",
    "two_mode_squeezed_order:0.5+0.3j,0.4",
    "fock:1",
    "fock:2",
    "fock:3",
    "thermal:1",
    "cat:1.5,odd",
    "cat:1.5,even",
    "mixture:0.5@fock:0|0.5@fock:1",
)

COHERENT_STATES = tuple(s for s in DEFAULT_BATTERY if s == "vacuum" or s.startswith("coherent:"))
