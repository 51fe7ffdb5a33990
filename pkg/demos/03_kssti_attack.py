"""
Session key from a leaked server ephemeral
==========================================

The eavesdropper records (R_i, T_i, Auth_i) and (R_s, T_s, Auth_s).  If the
server's per-session random r_s leaks, L_s = r_s * R_i, and every other input
of the session key is already on the wire.
"""
from tmis_workbench.attacks import LeakedEphemeral, kssti_attack
from tmis_workbench.harness import SERVER_ID, ScenarioConfig, fork, leak_ephemeral, run_session
from tmis_workbench.params import DESK
from tmis_workbench.primitives import FreshnessPolicy
from tmis_workbench.protocol import server_keygen

cfg = ScenarioConfig(param_set="desk", seed=3)
server = server_keygen(DESK, SERVER_ID, fork(cfg.seed, "server"), FreshnessPolicy(1000))
run = run_session(cfg, server, 0)

for rec in run.channel.recorded:
    print(f"{rec.direction:16s} t={rec.at_millis} {len(rec.payload)} bytes")

outcome = kssti_attack(run.transcript, leak_ephemeral(run.sstate, DESK), DESK)
for label, value in outcome.trace:
    print(f"  {label:30s} {value[:32]}...")
print("recovered == honest SK:", outcome.recovered_sk == run.sk_patient)

###############################################################################
# A wrong ephemeral gives a wrong key.
wrong = kssti_attack(run.transcript, LeakedEphemeral(run.sstate.r_s + 1), DESK)
print("wrong r_s recovers SK:", wrong.recovered_sk == run.sk_patient)
