"""
Registration and one honest login
=================================

A patient registers with the server, receives a smart card, and runs the
three-message login.  Both sides end with the same 32-byte session key.
"""
import random

from tmis_workbench.harness import LogicalClock
from tmis_workbench.params import DESK
from tmis_workbench.protocol import (
    PatientCredentials, patient_finish, patient_login_start,
    patient_make_registration, register_patient, server_handle_login, server_keygen,
)

rng = random.Random(2024)
server = server_keygen(DESK, b"TMIS-server", rng)
creds = PatientCredentials(ID_i=b"patient-0001", PW_i=b"correct horse", B_i=b"\x5a" * 32)

card = register_patient(server, patient_make_registration(creds))
print("registry:", server.registry)

clock = LogicalClock(1_600_000_000_000, step=5)
pstate, login = patient_login_start(card, creds, server.ID_s, clock, rng)
print("login message:", len(login.to_bytes()), "bytes at T_i =", login.T_i)

sstate, response = server_handle_login(server, login, clock, rng)
print("response message:", len(response.to_bytes()), "bytes at T_s =", response.T_s)

sk = patient_finish(pstate, response, clock, server.policy)
print("SK_i =", sk.hex())
print("SK_s =", sstate.SK_s.hex())
print("agree:", sk == sstate.SK_s)
