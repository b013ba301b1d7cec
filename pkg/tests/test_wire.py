import struct

import pytest

from roadfleet.wire import FRAME_KINDS, FrameError, FrameReader, decode_frame, encode_frame


def test_roundtrip_all_kinds():
    for kind in FRAME_KINDS:
        blob = encode_frame(kind, station="irs-1", n=7)
        frame = decode_frame(blob)
        assert frame["kind"] == kind
        assert frame["station"] == "irs-1"
        assert frame["n"] == 7


def test_length_prefix_is_big_endian_over_utf8_json():
    blob = encode_frame("PING", token=1)
    (length,) = struct.unpack_from(">I", blob)
    assert length == len(blob) - 4
    assert blob[4:].decode("utf-8").startswith("{")


def test_unknown_fields_are_kept_not_rejected():
    blob = encode_frame("REPORT", station="irs-1", future_field={"x": [1, 2]})
    frame = decode_frame(blob)
    assert frame["future_field"] == {"x": [1, 2]}


def test_unknown_kind_rejected_on_both_sides():
    with pytest.raises(FrameError):
        encode_frame("GOSSIP")
    bad = encode_frame("PING")
    tampered = bad[:4] + bad[4:].replace(b"PING", b"GOSS")
    with pytest.raises(FrameError):
        decode_frame(tampered)


def test_truncated_frame_rejected():
    blob = encode_frame("PING", token=1)
    with pytest.raises(FrameError):
        decode_frame(blob[:-2])


def test_stream_reader_reassembles_split_frames():
    frames = [encode_frame("HELLO", station="irs-1"),
              encode_frame("HEARTBEAT", station="irs-1"),
              encode_frame("REPORT", station="irs-1", reported={})]
    stream = b"".join(frames)
    reader = FrameReader()
    out = []
    # feed in awkward 5-byte chunks to cross every frame boundary
    for i in range(0, len(stream), 5):
        out.extend(reader.feed(stream[i:i + 5]))
    assert [f["kind"] for f in out] == ["HELLO", "HEARTBEAT", "REPORT"]
    assert reader.pending_bytes == 0
