"""
Old session keys after the server key leaks
===========================================

With the long-term key s the adversary rebuilds K_s = e(s * R_i, P), opens
Auth_i to learn the patient identity and r_i, and computes L_i = r_i * R_s.
Sessions recorded before the leak are therefore exposed.
"""
from tmis_workbench.attacks import LeakedLongTerm, pfs_attack
from tmis_workbench.errors import DecryptFailure
from tmis_workbench.harness import ScenarioConfig, run_pfs

report = run_pfs(ScenarioConfig(param_set="desk", seed=4, sessions=5))
print(report.to_text())

first = report.data["sessions"][0]["attack_results"][0]
for label, value in first["trace"]:
    print(f"  {label:45s} {value[:40]}")

###############################################################################
# Negative control: a wrong key cannot open Auth_i.
control = run_pfs(ScenarioConfig(param_set="desk", seed=4, sessions=5, corrupt_leak=True))
print(control.data["summary"]["attack_failures"])
