"""Listing command builder and TAB-separated output parser."""

from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dockhand.core import (
    ContainerState,
    ListingKind,
    ListingParseError,
    build_listing_command,
    derive_container_state,
    parse_listing,
    validate_command,
)


def test_container_listing_command_shape():
    command = build_listing_command(ListingKind.CONTAINERS_ALL)
    assert command.startswith("docker ps -a --format")


def test_image_listing_command_shape():
    assert build_listing_command(ListingKind.IMAGES).startswith("docker images --format")


def test_volume_listing_command_shape():
    assert build_listing_command(ListingKind.VOLUMES).startswith("docker volume ls --format")


@pytest.mark.parametrize("kind", list(ListingKind))
def test_listing_commands_pass_validation(kind):
    command = build_listing_command(kind)
    verdict = validate_command(command)
    assert verdict.accepted
    assert verdict.normalized == command


def test_container_filter_is_restricted():
    command = build_listing_command(ListingKind.CONTAINERS_ALL, container_filter="web-1")
    assert "name=web-1" in command
    assert validate_command(command).accepted
    with pytest.raises(ValueError):
        build_listing_command(ListingKind.CONTAINERS_ALL, container_filter="x;y")


def test_parse_single_container_line():
    records = parse_listing(ListingKind.CONTAINERS_ALL, "ab12\tweb\tnginx:latest\tUp 2 hours\n")
    assert len(records) == 1
    record = records[0]
    assert record.container_id == "ab12"
    assert record.name == "web"
    assert record.image == "nginx:latest"
    assert record.state is ContainerState.RUNNING


def test_parse_empty_text_gives_no_records():
    assert parse_listing(ListingKind.CONTAINERS_ALL, "") == []


def test_parse_wrong_field_count_reports_line():
    with pytest.raises(ListingParseError) as info:
        parse_listing(ListingKind.CONTAINERS_ALL, "only\ttwo\n")
    assert info.value.line_no == 1


def test_parse_reports_first_bad_line_number():
    text = "a\tb\tc\tUp 1 second\nbroken line\n"
    with pytest.raises(ListingParseError) as info:
        parse_listing(ListingKind.CONTAINERS_ALL, text)
    assert info.value.line_no == 2


def test_parse_names_with_spaces():
    records = parse_listing(
        ListingKind.CONTAINERS_ALL, "id1\tmy favourite container\timg\tExited (0) 3 days ago\n"
    )
    assert records[0].name == "my favourite container"
    assert records[0].state is ContainerState.EXITED


def test_parse_images_and_volumes():
    images = parse_listing(ListingKind.IMAGES, "sha1\tnginx\tlatest\t187MB\n")
    assert images[0].repository == "nginx"
    volumes = parse_listing(ListingKind.VOLUMES, "pgdata\tlocal\n")
    assert volumes[0].volume_name == "pgdata"


def test_parse_empty_identifier_is_an_error():
    with pytest.raises(ListingParseError):
        parse_listing(ListingKind.IMAGES, "\tnginx\tlatest\t187MB\n")


@pytest.mark.parametrize(
    "status,state",
    [
        ("Up 2 hours", ContainerState.RUNNING),
        ("Up (mock)", ContainerState.RUNNING),
        ("Exited (137) 2 days ago", ContainerState.EXITED),
        ("Created", ContainerState.CREATED),
        ("Paused", ContainerState.PAUSED),
        ("Restarting (1) 2 seconds ago", ContainerState.OTHER),
        ("", ContainerState.OTHER),
    ],
)
def test_state_derivation(status, state):
    assert derive_container_state(status) is state


@settings(max_examples=300)
@given(st.sampled_from(list(ListingKind)), st.text(max_size=400))
def test_parser_total_on_arbitrary_text(kind, text):
    # Returns records or a parse error with a line number; never anything else.
    try:
        records = parse_listing(kind, text)
    except ListingParseError as exc:
        assert exc.line_no >= 1
    else:
        assert isinstance(records, list)


_name_text = st.from_regex(r"[A-Za-z0-9][A-Za-z0-9 _.-]{0,20}", fullmatch=True)

_mock_state = st.fixed_dictionaries(
    {
        "containers": st.lists(
            st.fixed_dictionaries(
                {
                    "id": st.uuids().map(lambda u: u.hex[:12]),
                    "name": _name_text,
                    "image": _name_text,
                    "state": st.sampled_from(["created", "running", "exited", "paused"]),
                }
            ),
            unique_by=lambda c: c["id"],
            max_size=6,
        ),
        "images": st.lists(
            st.fixed_dictionaries(
                {
                    "id": st.uuids().map(lambda u: u.hex[:12]),
                    "repository": _name_text,
                    "tag": _name_text,
                    "size_text": _name_text,
                }
            ),
            unique_by=lambda i: i["id"],
            max_size=4,
        ),
        "volumes": st.lists(
            st.fixed_dictionaries({"name": _name_text, "driver": _name_text}),
            unique_by=lambda v: v["name"],
            max_size=4,
        ),
    }
)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(list(ListingKind)), _mock_state)
def test_builder_parser_coherence_against_mock_engine(tmp_path_factory, kind, state):
    """parse_listing(run(build_listing_command(k))) yields one record per resource."""
    import shlex

    from dockhand.mockdocker import dispatch, seed_state

    path = tmp_path_factory.mktemp("coherence") / "s.json"
    seed_state(path, state)
    command = build_listing_command(kind)
    argv = shlex.split(command)[1:]  # strip the engine binary name
    code, out, err = dispatch(argv, path)
    assert code == 0, err
    records = parse_listing(kind, out)
    expected = {
        ListingKind.CONTAINERS_ALL: len(state["containers"]),
        ListingKind.IMAGES: len(state["images"]),
        ListingKind.VOLUMES: len(state["volumes"]),
    }[kind]
    assert len(records) == expected
