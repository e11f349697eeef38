"""End-to-end sanity of the compiled module through the Python surface."""

import math

import pytest

import ragseed


def test_clean_and_chunk_round_trip():
    text = (
        "The SETUP request specifies the transport mechanism for the media.\n"
        "Example Corp                                             [Page 1]\n"
        "\x0c\n"
        "RFC Example                 RTSP Notes                February 2024\n"
        "\n"
        "The PLAY request tells the server to start sending data to the\n"
        "client using the mechanism already negotiated via SETUP earlier.\n"
    )
    cleaned = ragseed.clean_document(text)
    assert "[Page 1]" not in cleaned
    assert "RTSP Notes" not in cleaned

    chunks = ragseed.chunk_document(cleaned, chunk_size=5, overlap=8)
    assert len(chunks) >= 2
    assert chunks[0]["index"] == 0
    assert chunks[0]["token_count"] == 5
    # overlap: each later chunk starts with the tail of its predecessor
    assert chunks[1]["text"].startswith(chunks[0]["text"][-8:])

    rebuilt = chunks[0]["text"] + " " + chunks[1]["text"][8:]
    assert rebuilt.split()[:10] == cleaned.split()[:10]


def test_chunk_document_rejects_oversized_overlap():
    with pytest.raises(ValueError):
        ragseed.chunk_document("aa bb cc dd", chunk_size=2, overlap=50)


def test_embedding_and_retrieval():
    vec = ragseed.embed("SETUP PLAY TEARDOWN", dimension=64)
    assert len(vec) == 64
    assert math.isclose(sum(v * v for v in vec), 1.0, rel_tol=1e-9)
    assert ragseed.embed("SETUP PLAY TEARDOWN", dimension=64) == vec

    assert math.isclose(ragseed.cosine_similarity(vec, vec), 1.0, rel_tol=1e-12)

    texts = [
        "SETUP moves the session into the ready state",
        "PLAY starts delivery of the stream data",
        "TEARDOWN frees the session resources",
        "PLAY starts delivery of the stream data",
    ]
    hits = ragseed.retrieve_top_k(texts, "PLAY stream data delivery", k=3,
                                  dimension=128)
    assert len(hits) == 3
    indexes = [index for index, _ in hits]
    assert indexes[0] == 1 and indexes[1] == 3  # duplicate text ties in store order
    scores = [score for _, score in hits]
    assert scores[0] == scores[1] >= scores[2]


def test_rtsp_parse_serialize_and_fsm():
    raw = b"PLAY rtsp://media.example.com/stream RTSP/1.0\r\nCSeq: 2\r\nSession: 12345678\r\n\r\n"
    request = ragseed.parse_request(raw)
    assert request["method"] == "PLAY"
    assert request["uri"] == "rtsp://media.example.com/stream"
    assert ("CSeq", "2") in request["headers"]
    assert ragseed.serialize_request(request) == raw

    setup = b"SETUP rtsp://media.example.com/stream RTSP/1.0\r\nCSeq: 1\r\nTransport: RTP/AVP\r\n\r\n"
    teardown = b"TEARDOWN rtsp://media.example.com/stream RTSP/1.0\r\nCSeq: 3\r\nSession: 12345678\r\n\r\n"
    verdict = ragseed.validate_sequence([setup, raw, teardown])
    assert verdict["valid"] is True
    assert verdict["state_trace"] == ["READY", "PLAYING", "INIT"]

    # PLAY before SETUP is rejected by the session FSM
    verdict = ragseed.validate_sequence([raw])
    assert verdict["valid"] is False
    assert verdict["failing_index"] == 0


def test_metrics():
    assert ragseed.bleu("a b c d", "a b c d") == pytest.approx(1.0)
    assert ragseed.wer("a b c", "a x c") == pytest.approx(1.0 / 3.0)
    assert ragseed.rouge("a b", "a b c", variant="n1") == pytest.approx(2.0 / 3.0)
    assert ragseed.rouge("a x b", "a b", variant="lcs") == pytest.approx(1.0)
    assert ragseed.format_percent(0.8175) == "81.75%"
    assert ragseed.format_percent(0.23445) == "23.45%"
    with pytest.raises(ValueError):
        ragseed.bleu("a", "a b", max_n=0)


def test_run_command_usage_error():
    assert ragseed.run_command([]) == 2
    assert ragseed.run_command(["no-such-subcommand"]) == 2
