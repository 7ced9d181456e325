"""Shape checks for the general model, applied to every model the suite builds."""

checked = {"models": 0, "rows": 0}


def check_general_shape(model, cands):
    k = cands.k
    circuit = cands.circuit
    n_gates, n_pairs = len(cands.gates), len(cands.M2)
    assert len(cands.M) == (k - 1) * (len(circuit.unary_events) + circuit.num_qubits)
    assert model.num_rows == n_gates + n_pairs
    for row in model.rows[:n_gates]:
        assert len(row.cols) == k
    for row in model.rows[n_gates:]:
        assert sorted(row.coefs) == [-2, 1, 1] and row.rhs == 0
    checked["models"] += 1
    checked["rows"] += model.num_rows


def install():
    import dqc
    import dqc.bip as bip

    original = bip.build_msgc_general

    def checked_build(cands):
        model = original(cands)
        check_general_shape(model, cands)
        return model

    checked_build.__wrapped__ = original
    bip.build_msgc_general = checked_build
    dqc.build_msgc_general = checked_build
