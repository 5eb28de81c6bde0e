#!/usr/bin/env python3
# Copyright 2026 The ChainGuard Authors
# SPDX-License-Identifier: Apache-2.0
"""Independent reference values for the unit tests.

Builds the documented canonical bytes with the Python standard library and
the `cryptography` package only, then prints the digests and signatures the
C++ tests pin. Rerun after an intentional wire-format change.
"""
import hashlib
import json

from cryptography.hazmat.primitives.asymmetric.ed25519 import Ed25519PrivateKey
from cryptography.hazmat.primitives import serialization


def canon(v):
    return json.dumps(v, sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode()


def sha(b):
    return hashlib.sha256(b).hexdigest()


def ident(byte):
    sk = Ed25519PrivateKey.from_private_bytes(bytes([byte]) * 32)
    pk = sk.public_key().public_bytes(serialization.Encoding.Raw, serialization.PublicFormat.Raw)
    return sk, pk.hex(), hashlib.sha256(pk).digest()[-20:].hex()


admin_sk, admin_pk, admin = ident(0x01)
alice_sk, alice_pk, alice = ident(0x02)
validators = [ident(0x10 + i)[2] for i in range(4)]

state = {
    "params": {"chain_id": "chainguard-test", "validators": validators},
    "accounts": {admin: admin_pk},
    "users": {},
    "orgs": {
        "acme": {
            "admins": [admin],
            "roles": {
                "auditor": {"self_assignable": False, "max_holders": 1},
                "member": {"self_assignable": True, "max_holders": None},
            },
        }
    },
    "ura": [],
    "pra": [],
    "nonces": {},
}
state_root = sha(canon(state))
header = {
    "height": 0,
    "prev_hash": "00" * 32,
    "tx_root": sha(canon([])),
    "state_root": state_root,
    "proposer": "00" * 20,
    "timestamp": 0,
}
print("admin_address      ", admin)
print("alice_address      ", alice)
print("empty_tx_root      ", sha(canon([])))
print("genesis_state_root ", state_root)
print("genesis_header     ", canon(header).decode())
print("D0                 ", sha(canon(header)))

pw_digest = sha(b"correct horse aa" + bytes(16))
body = {
    "sender": alice,
    "nonce": 0,
    "payload": {
        "type": "RegisterUser",
        "user": alice,
        "public_key": alice_pk,
        "password_digest": pw_digest,
        "org": "acme",
        "requested_role": "member",
    },
}
sig = alice_sk.sign(canon(body)).hex()
tx = dict(body, signature=sig)
print("password_digest    ", pw_digest)
print("register_signature ", sig)
print("register_tx_id     ", sha(canon(tx)))
print("pbkdf2_10000       ", hashlib.pbkdf2_hmac("sha256", b"correct horse aa", bytes(16), 10000, 32).hex())
