import hashlib
import json
import numpy as np

# rows per independently seeded block of samples
BLOCK_ROWS = 4096

def hash_to_u64(text):
    digest = hashlib.sha256(text.encode('utf-8')).digest()
    return int.from_bytes(digest[:8], 'big', signed=False)

def derive_trial_seed(master_seed, tag, trial):
    """
    Stable per-trial seed from (master seed, experiment tag, trial index). Adding
    trials never changes the seeds of earlier ones
    """
    if trial < 0:
        raise ValueError('trial must be non-negative')
    return hash_to_u64('{0}:{1}:{2}'.format(master_seed, tag, trial))

def child_seed(seed, name):
    if not name:
        raise ValueError('stream name must be non-empty')
    return hash_to_u64('{0}:{1}'.format(seed, name))

def block_generator(seed, block):
    """
    Counter-based generator for one block of rows. Any block can be produced
    on its own, in any order, on any worker
    """
    seed_seq = np.random.SeedSequence(int(seed) & 0xFFFFFFFFFFFFFFFF, spawn_key=(int(block),))
    return np.random.Generator(np.random.Philox(seed_seq))

def block_ranges(n, block_rows=BLOCK_ROWS):
    for block, start in enumerate(range(0, n, block_rows)):
        yield block, start, min(n, start + block_rows)

def content_digest(data):
    """
    sha256 hex digest of a JSON-serializable mapping, keys sorted
    """
    encoded = json.dumps(data, sort_keys=True, separators=(',', ':'), allow_nan=True)
    return hashlib.sha256(encoded.encode('utf-8')).hexdigest()
