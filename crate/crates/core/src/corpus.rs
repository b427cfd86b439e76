//! Built-in litmus corpus.

use crate::lang::{parse_litmus, LitmusTest};

pub struct CorpusEntry {
    pub file: &'static str,
    pub source: &'static str,
    /// What the test exhibits.
    pub note: &'static str,
}

macro_rules! entry {
    ($file:literal, $note:literal) => {
        CorpusEntry { file: $file, source: include_str!(concat!("../corpus/", $file)), note: $note }
    };
}

pub const ENTRIES: &[CorpusEntry] = &[
    entry!("mp-nt.litmus", "a non-temporal store is not ordered before a later release store"),
    entry!("mp-nt-sf.litmus", "an sfence orders a non-temporal store before a release store"),
    entry!("mp-nt-read.litmus", "reading back a non-temporal store does not publish it"),
    entry!("mp-rlx.litmus", "release/acquire message passing with a relaxed payload"),
    entry!("iriw.litmus", "release/acquire reads need not agree on the order of independent writes"),
    entry!("iriw-tso.litmus", "assembly reads restore multi-copy atomicity"),
    entry!("iriw-tso-2.litmus", "a single assembly reader does not order a relaxed reader"),
    entry!("mp-nt-relfence.litmus", "a release fence does not order a preceding non-temporal store"),
    entry!("mp-nt-sfence.litmus", "an sfence heads a release sequence"),
    entry!("mp-na-guarded.litmus", "a non-atomic payload is published by release/acquire"),
    entry!("mp-nt-guarded.litmus", "a non-temporal payload is not published by release/acquire"),
    entry!("catch-fire-na.litmus", "a race on a non-atomic access makes every behavior possible"),
    entry!("catch-fire-nt.litmus", "a race on a non-temporal store is not undefined"),
    entry!("z6u-tso.litmus", "assembly accesses are stronger than sc accesses here"),
    entry!("z6u-sc.litmus", "the sc counterpart of the previous test admits the weak outcome"),
    entry!("sb-sc.litmus", "store buffering with sc accesses only"),
    entry!("seq-nt-3.litmus", "three threads whose first two are sequentialized in the next test"),
    entry!("seq-nt-2.litmus", "sequentializing a non-temporal writer with its reader adds a behavior"),
    entry!("seq-tso-3.litmus", "three assembly threads whose first two are sequentialized in the next test"),
    entry!("seq-tso-2.litmus", "sequentializing two assembly threads adds a store-forwarding behavior"),
    entry!("promote-rmw.litmus", "an assembly RMW orders a preceding non-temporal store"),
    entry!("sb-rel-asm.litmus", "a release store does not order an earlier store before a later read"),
    entry!("merge-sites.litmus", "adjacent same-location accesses and fences that can be merged"),
    entry!("merge-sc.litmus", "an sc store followed by a load of the same location"),
    entry!("drf-mp.litmus", "race-free message passing through an sc flag"),
    entry!("drf-handoff.litmus", "race-free handoff of two non-atomic locations through an sc flag"),
];

/// Parses every entry. The corpus is fixed, so parse errors are bugs.
pub fn tests() -> Vec<(&'static CorpusEntry, LitmusTest)> {
    ENTRIES.iter().map(|e| (e, parse_litmus(e.source).unwrap_or_else(|err| panic!("{}: {err}", e.file)))).collect()
}

pub fn get(name: &str) -> Option<LitmusTest> {
    tests().into_iter().find(|(e, t)| t.name == name || e.file.trim_end_matches(".litmus") == name).map(|(_, t)| t)
}
