#!/usr/bin/env python3
"""Generates the 200-event GH-Archive-style fixture plus its expected-output
golden file. The expected counts come from this script's own bookkeeping of
what it plants, not from running the miner."""

import hashlib
import json
import os

HERE = os.path.dirname(os.path.abspath(__file__))
REPO = "acme/alpha"

LONG_FILLERS = [
    "the scheduler keeps dropping the retry queue when the worker pool saturates",
    "we need to gate the rollout behind the feature flag until the migration lands",
    "telemetry shows the cache hit rate falling sharply after the deploy window",
    "the parser rejects nested quotes inside the config block on older releases",
    "users report that the export job stalls once the dataset crosses the limit",
    "the watchdog restarts the agent loop twice before the lease renewal succeeds",
    "memory growth in the indexer points at the arena allocator retaining pages",
    "the login flow loops back to the consent page when cookies are disabled",
]

SHORT_FILLERS = [
    "fix the flaky test",
    "bump version and tag",
    "typo in readme",
    "update ci badge",
]


def tokens(text):
    out = []
    cur = []
    for ch in text.lower():
        if ch.isalnum():
            cur.append(ch)
        elif cur:
            out.append("".join(cur))
            cur = []
    if cur:
        out.append("".join(cur))
    return out


def long_text(i, extra=""):
    base = LONG_FILLERS[i % len(LONG_FILLERS)]
    text = (base + " " + extra).strip()
    assert len(tokens(text)) >= 10, text
    return text


def short_text(i):
    text = SHORT_FILLERS[i % len(SHORT_FILLERS)]
    assert len(tokens(text)) < 10, text
    return text


def make_sha(i):
    """40-char lowercase hex with a digit in the first 7 chars."""
    salt = 0
    while True:
        sha = hashlib.sha1(f"commit{i}:{salt}".encode()).hexdigest()
        head = sha[:7]
        if any(c.isdigit() for c in head):
            return sha
        salt += 1


def main():
    events = []
    ts = [0]

    def stamp():
        ts[0] += 1
        return f"2021-01-01T{ts[0] // 3600:02d}:{(ts[0] % 3600) // 60:02d}:{ts[0] % 60:02d}Z"

    def add(type_, payload):
        events.append(json.dumps({
            "type": type_,
            "repo": {"name": REPO},
            "created_at": stamp(),
            "payload": payload,
        }))

    expected = {
        "recognized_events": 0,
        "skipped_event_types": 0,
        "parse_errors": 0,
        "missing_fields": 0,
        "autolinks_extracted": 0,
        "nodes_built": 0,
        "edges_built": {"issue_commit": 0, "issue_pull": 0, "pull_commit": 0,
                        "comment_issue": 0, "comment_pull": 0},
        "dangling_removed_build": 0,
        "short_artifacts_dropped": 0,
        "dangling_removed_total": 0,
        "cleaned_nodes": 0,
        "cleaned_edges": {},
        "adjacent_pairs": 0,
    }

    shas = {i: make_sha(i) for i in range(1, 61)}
    assert len({s[:7] for s in shas.values()}) == 60, "sha prefixes must be unique"

    long_node_ids = []
    short_node_ids = []

    # --- 40 IssuesEvent -----------------------------------------------------
    for n in range(1, 41):
        if n <= 20 or (27 <= n <= 36):
            body = long_text(n)
        elif 21 <= n <= 24:
            body = long_text(n, f"see commit {shas[n][:7]} for the fix")
            expected["autolinks_extracted"] += 1       # the sha reference
            expected["edges_built"]["issue_commit"] += 1
        elif n == 25:
            body = long_text(n, "related to #999 and acme/beta#1 upstream")
            expected["autolinks_extracted"] += 2       # both references
            expected["dangling_removed_build"] += 2    # neither resolves
        elif n == 26:
            body = long_text(n, "superseded by #101 after review")
            expected["autolinks_extracted"] += 1
            expected["edges_built"]["issue_pull"] += 1
        else:  # 37..40 deliberately short
            body = short_text(n)
        title = f"issue {n} report"
        add("IssuesEvent", {"action": "opened",
                            "issue": {"number": n, "title": title, "body": body}})
        expected["recognized_events"] += 1
        node_id = f"{REPO}#{n}"
        if len(tokens(title + " " + body)) >= 10:
            long_node_ids.append(node_id)
        else:
            short_node_ids.append(node_id)

    # --- 40 PushEvent (60 commits) ------------------------------------------
    def commit_message(c):
        if c <= 10:
            expected["autolinks_extracted"] += 1
            expected["edges_built"]["issue_commit"] += 1
            return long_text(c, f"closes #{c} in the dispatcher")
        if c in (11, 12):
            expected["autolinks_extracted"] += 1
            expected["dangling_removed_build"] += 1
            return long_text(c, f"refs #{986 + c} which was never filed")
        if c == 13:
            expected["autolinks_extracted"] += 1       # duplicate deduplicated
            expected["edges_built"]["issue_commit"] += 1
            return long_text(c, "fixes #3 and #3 once more")
        if c == 14:
            # deedbee has no digit, cafe12 is short, 1234567x is unbounded
            return long_text(c, "mentions deedbee cafe12 1234567x only")
        if c <= 56:
            return long_text(c, "routine maintenance of the build scripts")
        return short_text(c)  # 57..60

    commit_no = 1
    for _ in range(40):
        per_event = 2 if commit_no <= 40 else 1
        commits = []
        for _ in range(per_event):
            if commit_no > 60:
                break
            msg = commit_message(commit_no)
            commits.append({"sha": shas[commit_no], "message": msg})
            node_id = f"{REPO}@{shas[commit_no]}"
            if len(tokens(msg)) >= 10:
                long_node_ids.append(node_id)
            else:
                short_node_ids.append(node_id)
            commit_no += 1
        add("PushEvent", {"commits": commits})
        expected["recognized_events"] += 1
    assert commit_no == 61, commit_no

    # --- 20 PullRequestEvent (#101..#120) -----------------------------------
    for n in range(101, 121):
        pr = {"number": n, "title": f"pull {n} patch"}
        if 101 <= n <= 105:
            pr["body"] = long_text(n)
            pr["head"] = {"sha": shas[15 + (n - 101)]}
            expected["edges_built"]["pull_commit"] += 1
        elif n == 106:
            pr["body"] = long_text(n, "resolves #2 as discussed")
            pr["merge_commit_sha"] = "e" * 39 + "1"  # never pushed
            expected["autolinks_extracted"] += 1
            expected["edges_built"]["issue_pull"] += 1
            expected["dangling_removed_build"] += 1
        elif n <= 119:
            pr["body"] = long_text(n)
        else:  # 120 short
            pr["body"] = short_text(n)
        add("PullRequestEvent", {"action": "opened", "pull_request": pr})
        expected["recognized_events"] += 1
        node_id = f"{REPO}!{n}"
        if len(tokens(pr["title"] + " " + pr["body"])) >= 10:
            long_node_ids.append(node_id)
        else:
            short_node_ids.append(node_id)

    # --- 70 IssueCommentEvent ------------------------------------------------
    for k in range(55):
        parent = 1 + (k % 36)
        comment_id = 1001 + k
        body = long_text(k) if k < 53 else short_text(k)
        add("IssueCommentEvent", {
            "issue": {"number": parent, "title": f"issue {parent} report",
                      "body": "placeholder"},
            "comment": {"id": comment_id, "body": body},
        })
        expected["recognized_events"] += 1
        expected["edges_built"]["comment_issue"] += 1
        node_id = f"{REPO}/comment/{comment_id}"
        if len(tokens(body)) >= 10:
            long_node_ids.append(node_id)
        else:
            short_node_ids.append(node_id)

    for k in range(15):
        parent = 101 + (k % 5)
        comment_id = 2001 + k
        body = long_text(k, "the review thread agrees with this direction")
        add("IssueCommentEvent", {
            "issue": {"number": parent, "title": f"pull {parent} patch",
                      "body": "placeholder", "pull_request": {}},
            "comment": {"id": comment_id, "body": body},
        })
        expected["recognized_events"] += 1
        expected["edges_built"]["comment_pull"] += 1
        long_node_ids.append(f"{REPO}/comment/{comment_id}")

    # --- junk: 20 unrecognized + 6 malformed + 4 missing fields --------------
    for k in range(20):
        type_ = "WatchEvent" if k < 10 else "ForkEvent"
        add(type_, {"action": "started"})
        expected["skipped_event_types"] += 1

    for k in range(6):
        events.append('{"type": "PushEvent", "repo": {"name"')  # truncated
        expected["parse_errors"] += 1

    add("IssuesEvent", {"action": "opened"})  # no issue object
    add("IssuesEvent", {"action": "opened", "issue": {"title": "x", "body": "y"}})
    add("PushEvent", {"ref": "refs/heads/main"})  # no commits array
    add("IssueCommentEvent", {"issue": {"number": 1}})  # no comment object
    expected["recognized_events"] += 4
    expected["missing_fields"] += 4

    assert len(events) == 200, len(events)

    # --- derived golden numbers ----------------------------------------------
    expected["nodes_built"] = len(long_node_ids) + len(short_node_ids)
    expected["short_artifacts_dropped"] = len(short_node_ids)
    expected["cleaned_nodes"] = len(long_node_ids)

    # Cleaning also removes edges touching dropped nodes: only the two short
    # issue comments carry edges (comment_issue each).
    short_comments = [i for i in short_node_ids if "/comment/" in i]
    cleaned = dict(expected["edges_built"])
    cleaned["comment_issue"] -= len(short_comments)
    expected["cleaned_edges"] = cleaned
    expected["dangling_removed_total"] = (
        expected["dangling_removed_build"] + len(short_comments))
    expected["adjacent_pairs"] = expected["edges_built"]["issue_commit"]

    with open(os.path.join(HERE, "gh_events.jsonl"), "w") as f:
        f.write("\n".join(events) + "\n")
    with open(os.path.join(HERE, "gh_expected.json"), "w") as f:
        json.dump(expected, f, indent=2, sort_keys=True)
        f.write("\n")
    print("wrote 200 events;", json.dumps(expected, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
