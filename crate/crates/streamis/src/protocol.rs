//! One-way multi-player communication games over edge-partitioned graphs.
//!
//! The players receive edge-disjoint graphs whose union is the input; player
//! `i` sees only its own edges plus the single message of player `i-1`, and
//! the last player's message encodes the claimed independent set as a vertex
//! bitmap. A streaming algorithm becomes a protocol by letting each player
//! resume the algorithm from the state serialized in the previous message —
//! which is why every message is bounded by the same bit budget as the
//! algorithm's memory.

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, VertexSet, MAX_VERTICES};
use crate::streaming::{state_bits, StreamingAlgorithm};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

// =============================================================================
// Messages
// =============================================================================

/// A bounded bit string passed between players.
///
/// Ordering is by (bit length, then bytes lexicographically), which gives the
/// deterministic iteration order used when bucketing graphs by the message
/// they elicit.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Message {
    bit_len: u64,
    #[serde(with = "hex_bytes")]
    bytes: Vec<u8>,
}

mod hex_bytes {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(bytes: &[u8], ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&hex::encode(bytes))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<u8>, D::Error> {
        let s = String::deserialize(de)?;
        hex::decode(&s).map_err(serde::de::Error::custom)
    }
}

impl Message {
    /// Wrap a serialized algorithm state: eight bits per byte.
    pub fn from_state_bytes(bytes: Vec<u8>) -> Message {
        let bit_len = state_bits(&bytes);
        Message { bit_len, bytes }
    }

    /// Encode a vertex set over an `n`-vertex universe as an `n`-bit bitmap.
    pub fn bitmap(set: VertexSet, n: usize) -> Result<Message> {
        if n == 0 || n > MAX_VERTICES {
            return Err(Error::InvalidParameter(format!(
                "bitmap universe {n} outside 1..={MAX_VERTICES}"
            )));
        }
        if !set.is_subset_of(VertexSet::full(n)) {
            return Err(Error::InvalidParameter(
                "bitmap set reaches outside its universe".into(),
            ));
        }
        let mut bytes = vec![0u8; n.div_ceil(8)];
        for v in set.iter() {
            bytes[v / 8] |= 1 << (v % 8);
        }
        Ok(Message {
            bit_len: n as u64,
            bytes,
        })
    }

    /// Decode an `n`-bit vertex bitmap; rejects any other message shape.
    pub fn decode_bitmap(&self, n: usize) -> Result<VertexSet> {
        if self.bit_len != n as u64 || self.bytes.len() != n.div_ceil(8) {
            return Err(Error::Parse(format!(
                "message of {} bits is not an {n}-bit vertex bitmap",
                self.bit_len
            )));
        }
        let mut set = VertexSet::EMPTY;
        for v in 0..n {
            if self.bytes[v / 8] & (1 << (v % 8)) != 0 {
                set = set.with(v);
            }
        }
        // Padding bits beyond position n-1 must be clear.
        for pos in n..8 * self.bytes.len() {
            if self.bytes[pos / 8] & (1 << (pos % 8)) != 0 {
                return Err(Error::Parse(
                    "vertex bitmap has nonzero padding bits".into(),
                ));
            }
        }
        Ok(set)
    }

    /// Reinterpret the message as a serialized algorithm state.
    pub fn state_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn bit_len(&self) -> u64 {
        self.bit_len
    }

    pub fn digest_hex(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.bit_len.to_le_bytes());
        hasher.update(&self.bytes);
        hex::encode(hasher.finalize())
    }
}

// =============================================================================
// Player inputs
// =============================================================================

/// The edge sequence handed to one player, in the exact order the player will
/// consume it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlayerInput {
    edges: Vec<Edge>,
}

impl PlayerInput {
    /// Canonical form of a graph: its edges in ascending lexicographic order.
    pub fn from_graph(g: &Graph) -> PlayerInput {
        PlayerInput { edges: g.edges() }
    }

    /// Two-block form: all `first` edges (ascending), then all `second` edges
    /// (ascending). The blocks must be edge-disjoint.
    pub fn from_blocks(first: &Graph, second: &Graph) -> Result<PlayerInput> {
        let mut edges = first.edges();
        let tail = second.edges();
        for &e in &tail {
            if first.has_edge(e.0, e.1) {
                return Err(Error::InvalidParameter(format!(
                    "edge ({}, {}) appears in both input blocks",
                    e.0, e.1
                )));
            }
        }
        edges.extend(tail);
        Ok(PlayerInput { edges })
    }

    /// An explicit edge order; duplicates and malformed pairs are rejected.
    pub fn from_ordered_edges(n: usize, edges: Vec<Edge>) -> Result<PlayerInput> {
        let mut seen = std::collections::HashSet::new();
        for &(u, v) in &edges {
            if u >= v || v >= n {
                return Err(Error::InvalidParameter(format!(
                    "player input edge ({u}, {v}) malformed for universe {n}"
                )));
            }
            if !seen.insert((u, v)) {
                return Err(Error::InvalidParameter(format!(
                    "player input repeats edge ({u}, {v})"
                )));
            }
        }
        Ok(PlayerInput { edges })
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn to_graph(&self, n: usize) -> Result<Graph> {
        Graph::from_edges(n, &self.edges)
    }
}

// =============================================================================
// Players and transcripts
// =============================================================================

/// One participant of the one-way game: sees its own edges plus all prior
/// messages, and must answer deterministically.
pub trait Player {
    fn respond(&self, input: &PlayerInput, prior: &[Message]) -> Result<Message>;
}

/// The full record of a protocol run: one message per player, with the last
/// message decoded as the claimed vertex set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub messages: Vec<Message>,
    pub final_output: VertexSet,
}

impl Transcript {
    pub fn message_digests(&self) -> Vec<String> {
        self.messages.iter().map(Message::digest_hex).collect()
    }
}

/// Execute the one-way game.
///
/// Checks, in order: at least one player, matching input count, the output
/// bitmap fits the budget (`n ≤ budget_bits`), the inputs are edge-disjoint,
/// and (when `max_degree` is given) the union graph respects that bound. Each
/// message is then checked against the budget as it is produced, and the last
/// message must decode as an `n`-bit vertex bitmap.
pub fn run_protocol(
    players: &[&dyn Player],
    inputs: &[PlayerInput],
    n: usize,
    budget_bits: u64,
    max_degree: Option<usize>,
) -> Result<Transcript> {
    if players.is_empty() {
        return Err(Error::InvalidParameter("protocol needs at least one player".into()));
    }
    if players.len() != inputs.len() {
        return Err(Error::InvalidParameter(format!(
            "{} players but {} inputs",
            players.len(),
            inputs.len()
        )));
    }
    if (n as u64) > budget_bits {
        return Err(Error::BudgetViolation {
            bits: n as u64,
            budget: budget_bits,
            context: "an n-bit output bitmap can never fit the message budget".into(),
        });
    }
    let mut union = Graph::empty(n)?;
    for (idx, input) in inputs.iter().enumerate() {
        for &(u, v) in input.edges() {
            if u >= v || v >= n {
                return Err(Error::InvalidParameter(format!(
                    "input {idx} holds malformed edge ({u}, {v})"
                )));
            }
            if union.has_edge(u, v) {
                return Err(Error::InvalidParameter(format!(
                    "inputs are not edge-disjoint: ({u}, {v}) repeats at input {idx}"
                )));
            }
            union = union.with_edge(u, v)?;
        }
    }
    if let Some(cap) = max_degree {
        if union.max_degree() > cap {
            return Err(Error::InvalidParameter(format!(
                "combined input degree {} exceeds the promised bound {cap}",
                union.max_degree()
            )));
        }
    }

    let mut messages: Vec<Message> = Vec::with_capacity(players.len());
    for (idx, (player, input)) in players.iter().zip(inputs).enumerate() {
        let msg = player.respond(input, &messages)?;
        if msg.bit_len() > budget_bits {
            return Err(Error::BudgetViolation {
                bits: msg.bit_len(),
                budget: budget_bits,
                context: format!("message emitted by player {}", idx + 1),
            });
        }
        messages.push(msg);
    }
    let last = messages.last().expect("at least one player");
    let final_output = last.decode_bitmap(n).map_err(|_| Error::BudgetViolation {
        bits: last.bit_len(),
        budget: n as u64,
        context: "final message must be an n-bit vertex bitmap".into(),
    })?;
    Ok(Transcript {
        messages,
        final_output,
    })
}

// =============================================================================
// Streaming algorithms as players
// =============================================================================

/// Player `index` (zero-based) of `count` in the reduction from a streaming
/// algorithm: resume the state from the previous message, feed it this
/// player's edges, and emit either the new state or — for the last player —
/// the output bitmap after checking the pre-output state against the budget.
pub struct StreamingPlayer<'a> {
    alg: &'a dyn StreamingAlgorithm,
    index: usize,
    count: usize,
    budget_bits: u64,
}

impl<'a> StreamingPlayer<'a> {
    pub fn new(
        alg: &'a dyn StreamingAlgorithm,
        index: usize,
        count: usize,
        budget_bits: u64,
    ) -> Result<Self> {
        if count == 0 || index >= count {
            return Err(Error::InvalidParameter(format!(
                "player index {index} outside a {count}-player game"
            )));
        }
        Ok(Self {
            alg,
            index,
            count,
            budget_bits,
        })
    }
}

impl Player for StreamingPlayer<'_> {
    fn respond(&self, input: &PlayerInput, prior: &[Message]) -> Result<Message> {
        if prior.len() != self.index {
            return Err(Error::InvalidParameter(format!(
                "player {} expected {} prior messages, saw {}",
                self.index + 1,
                self.index,
                prior.len()
            )));
        }
        let mut state = match prior.last() {
            None => self.alg.init_state(),
            Some(msg) => msg.state_bytes().to_vec(),
        };
        for &e in input.edges() {
            state = self.alg.process_edge(state, e)?;
        }
        if self.index + 1 == self.count {
            // The memory bound applies to the state the algorithm holds when
            // the stream ends, before it is allowed to decode its answer.
            if state_bits(&state) > self.budget_bits {
                return Err(Error::BudgetViolation {
                    bits: state_bits(&state),
                    budget: self.budget_bits,
                    context: "state held at end of stream, before output".into(),
                });
            }
            let out = self.alg.finalize(&state)?;
            Message::bitmap(out, self.alg.vertex_count())
        } else {
            Ok(Message::from_state_bytes(state))
        }
    }
}

/// Build the `k` reduction players for one algorithm.
pub fn streaming_players(
    alg: &dyn StreamingAlgorithm,
    k: usize,
    budget_bits: u64,
) -> Result<Vec<StreamingPlayer<'_>>> {
    (0..k)
        .map(|i| StreamingPlayer::new(alg, i, k, budget_bits))
        .collect()
}

/// Run the reduction end to end on explicit player inputs.
pub fn run_streaming_protocol(
    alg: &dyn StreamingAlgorithm,
    inputs: &[PlayerInput],
    budget_bits: u64,
    max_degree: Option<usize>,
) -> Result<Transcript> {
    let players = streaming_players(alg, inputs.len(), budget_bits)?;
    let refs: Vec<&dyn Player> = players.iter().map(|p| p as &dyn Player).collect();
    run_protocol(&refs, inputs, alg.vertex_count(), budget_bits, max_degree)
}

// =============================================================================
// Tests
// =============================================================================

#[cfg(test)]
mod tests {
    use super::*;
    use crate::streaming::{self, ClaimAll, DetSubsample, RandPermutation};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn k4_within(n: usize) -> Graph {
        Graph::from_edges(n, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    // --- messages ---

    #[test]
    fn bitmap_round_trips_and_validates_padding() {
        let set: VertexSet = [0, 3, 9].into_iter().collect();
        let msg = Message::bitmap(set, 12).unwrap();
        assert_eq!(msg.bit_len(), 12);
        assert_eq!(msg.decode_bitmap(12).unwrap(), set);
        assert!(msg.decode_bitmap(11).is_err());
        // Nonzero padding bit just past the universe.
        let mut bad = msg.clone();
        bad.bytes[1] |= 1 << 4;
        assert!(bad.decode_bitmap(12).is_err());
    }

    #[test]
    fn state_messages_charge_eight_bits_per_byte() {
        let msg = Message::from_state_bytes(vec![1, 2, 3]);
        assert_eq!(msg.bit_len(), 24);
        assert_eq!(msg.state_bytes(), &[1, 2, 3]);
    }

    #[test]
    fn message_order_is_length_then_bytes() {
        let a = Message::from_state_bytes(vec![9]);
        let b = Message::from_state_bytes(vec![0, 0]);
        let c = Message::from_state_bytes(vec![0, 1]);
        assert!(a < b && b < c);
    }

    #[test]
    fn message_serde_round_trips() {
        let msg = Message::from_state_bytes(vec![7, 255, 0]);
        let json = serde_json::to_string(&msg).unwrap();
        assert!(json.contains("07ff00"));
        let back: Message = serde_json::from_str(&json).unwrap();
        assert_eq!(back, msg);
    }

    // --- player inputs ---

    #[test]
    fn graph_input_uses_ascending_edge_order() {
        let g = Graph::from_edges(5, &[(2, 4), (0, 3), (0, 1)]).unwrap();
        let input = PlayerInput::from_graph(&g);
        assert_eq!(input.edges(), &[(0, 1), (0, 3), (2, 4)]);
    }

    #[test]
    fn block_input_keeps_first_block_ahead() {
        let r = Graph::from_edges(6, &[(3, 4), (0, 5)]).unwrap();
        let h = Graph::from_edges(6, &[(0, 1), (2, 3)]).unwrap();
        let input = PlayerInput::from_blocks(&r, &h).unwrap();
        assert_eq!(input.edges(), &[(0, 5), (3, 4), (0, 1), (2, 3)]);
        assert!(PlayerInput::from_blocks(&r, &r).is_err());
    }

    #[test]
    fn ordered_input_rejects_duplicates_and_bad_pairs() {
        assert!(PlayerInput::from_ordered_edges(5, vec![(0, 1), (0, 1)]).is_err());
        assert!(PlayerInput::from_ordered_edges(5, vec![(1, 1)]).is_err());
        assert!(PlayerInput::from_ordered_edges(5, vec![(3, 1)]).is_err());
        assert!(PlayerInput::from_ordered_edges(5, vec![(0, 9)]).is_err());
        let ok = PlayerInput::from_ordered_edges(5, vec![(2, 3), (0, 1)]).unwrap();
        assert_eq!(ok.edges(), &[(2, 3), (0, 1)]);
    }

    // --- reduction correctness ---

    #[test]
    fn two_player_split_of_a_clique_matches_direct_run() {
        let alg = DetSubsample::new(12, 3).unwrap();
        let g = k4_within(12);
        let edges = g.edges();
        let first = PlayerInput::from_ordered_edges(12, edges[..3].to_vec()).unwrap();
        let second = PlayerInput::from_ordered_edges(12, edges[3..].to_vec()).unwrap();
        let t = run_streaming_protocol(&alg, &[first, second], 512, None).unwrap();
        assert_eq!(t.messages.len(), 2);
        assert_eq!(t.final_output, streaming::run(&alg, &edges).unwrap());
        assert_eq!(t.final_output.len(), 1);
    }

    #[test]
    fn reduction_equals_direct_run_across_algorithms_and_splits() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        for trial in 0..40 {
            let n = rng.random_range(6..=16);
            let mut g = Graph::empty(n).unwrap();
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.random_bool(0.3) {
                        g = g.with_edge(u, v).unwrap();
                    }
                }
            }
            let algs: Vec<Box<dyn StreamingAlgorithm>> = vec![
                Box::new(DetSubsample::new(n, (n - 1).max(1)).unwrap()),
                Box::new(RandPermutation::new(n, trial).unwrap()),
                Box::new(ClaimAll::new(n).unwrap()),
            ];
            for alg in &algs {
                for k in 1..=3usize {
                    // Random edge partition; each part in canonical ascending order.
                    let mut parts: Vec<Vec<Edge>> = vec![Vec::new(); k];
                    for &e in &g.edges() {
                        parts[rng.random_range(0..k)].push(e);
                    }
                    let inputs: Vec<PlayerInput> = parts
                        .iter()
                        .map(|p| PlayerInput::from_ordered_edges(n, p.clone()).unwrap())
                        .collect();
                    let stream: Vec<Edge> =
                        inputs.iter().flat_map(|i| i.edges().to_vec()).collect();
                    let t = run_streaming_protocol(&**alg, &inputs, 4096, None).unwrap();
                    assert_eq!(
                        t.final_output,
                        streaming::run(&**alg, &stream).unwrap(),
                        "algorithm {} with {k} players",
                        alg.name()
                    );
                }
            }
        }
    }

    #[test]
    fn early_messages_ignore_later_inputs() {
        let alg = DetSubsample::new(10, 2).unwrap();
        let shared = PlayerInput::from_ordered_edges(10, vec![(0, 1)]).unwrap();
        let tail_a = PlayerInput::from_ordered_edges(10, vec![(2, 3)]).unwrap();
        let tail_b = PlayerInput::from_ordered_edges(10, vec![(2, 4)]).unwrap();
        let empty = PlayerInput::from_ordered_edges(10, vec![]).unwrap();
        let ta = run_streaming_protocol(
            &alg,
            &[shared.clone(), tail_a, empty.clone()],
            512,
            None,
        )
        .unwrap();
        let tb = run_streaming_protocol(&alg, &[shared, tail_b, empty], 512, None).unwrap();
        assert_eq!(ta.messages[0], tb.messages[0]);
        assert_ne!(ta.messages[1], tb.messages[1]);
    }

    #[test]
    fn replay_is_bit_exact() {
        let alg = RandPermutation::new(14, 5).unwrap();
        let g = k4_within(14);
        let inputs = vec![
            PlayerInput::from_graph(&g),
            PlayerInput::from_ordered_edges(14, vec![(5, 6)]).unwrap(),
        ];
        let a = run_streaming_protocol(&alg, &inputs, 512, None).unwrap();
        let b = run_streaming_protocol(&alg, &inputs, 512, None).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.message_digests(), b.message_digests());
    }

    #[test]
    fn empty_inputs_replay_the_empty_trace() {
        let alg = DetSubsample::new(8, 2).unwrap();
        let empty = PlayerInput::from_ordered_edges(8, vec![]).unwrap();
        let inputs = vec![empty.clone(), empty.clone(), empty];
        let a = run_streaming_protocol(&alg, &inputs, 128, None).unwrap();
        let b = run_streaming_protocol(&alg, &inputs, 128, None).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.final_output, alg.sample());
    }

    // --- guard rails ---

    #[test]
    fn overlapping_inputs_are_rejected() {
        let alg = ClaimAll::new(6).unwrap();
        let a = PlayerInput::from_ordered_edges(6, vec![(0, 1)]).unwrap();
        let b = PlayerInput::from_ordered_edges(6, vec![(0, 1)]).unwrap();
        let err = run_streaming_protocol(&alg, &[a, b], 64, None).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter(_)));
    }

    #[test]
    fn degree_promise_is_enforced_on_the_union() {
        let alg = ClaimAll::new(6).unwrap();
        let a = PlayerInput::from_ordered_edges(6, vec![(0, 1), (0, 2)]).unwrap();
        let b = PlayerInput::from_ordered_edges(6, vec![(0, 3)]).unwrap();
        assert!(run_streaming_protocol(&alg, &[a.clone(), b.clone()], 64, Some(3)).is_ok());
        let err = run_streaming_protocol(&alg, &[a, b], 64, Some(2)).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter(_)));
    }

    #[test]
    fn budget_smaller_than_output_bitmap_fails_upfront() {
        let alg = ClaimAll::new(20).unwrap();
        let empty = PlayerInput::from_ordered_edges(20, vec![]).unwrap();
        let err = run_streaming_protocol(&alg, &[empty], 19, None).unwrap_err();
        assert!(matches!(err, Error::BudgetViolation { .. }));
    }

    #[test]
    fn oversized_intermediate_message_is_a_budget_violation() {
        let alg = DetSubsample::new(16, 1).unwrap(); // sample = all 16 vertices
        let edges: Vec<Edge> = (1..8).map(|v| (0, v)).collect();
        let first = PlayerInput::from_ordered_edges(16, edges).unwrap();
        let empty = PlayerInput::from_ordered_edges(16, vec![]).unwrap();
        // After seven stored edges the state is 16 + 7·16 = 128 bits.
        let err = run_streaming_protocol(&alg, &[first.clone(), empty.clone()], 120, None)
            .unwrap_err();
        match err {
            Error::BudgetViolation { bits, budget, .. } => {
                assert_eq!(bits, 128);
                assert_eq!(budget, 120);
            }
            other => panic!("unexpected error {other:?}"),
        }
        assert!(run_streaming_protocol(&alg, &[first, empty], 128, None).is_ok());
    }

    #[test]
    fn final_state_is_checked_before_output_decoding() {
        // One player, so the only message is the output bitmap (16 bits), but
        // the pre-output state has grown past the budget and must be charged.
        let alg = DetSubsample::new(16, 1).unwrap();
        let edges: Vec<Edge> = (1..8).map(|v| (0, v)).collect();
        let input = PlayerInput::from_ordered_edges(16, edges).unwrap();
        let err = run_streaming_protocol(&alg, &[input], 64, None).unwrap_err();
        match err {
            Error::BudgetViolation { bits, context, .. } => {
                assert_eq!(bits, 128);
                assert!(context.contains("end of stream"));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn foreign_final_message_is_flagged_as_protocol_violation() {
        struct Babbler;
        impl Player for Babbler {
            fn respond(&self, _: &PlayerInput, _: &[Message]) -> Result<Message> {
                Ok(Message::from_state_bytes(vec![0xAB, 0xCD]))
            }
        }
        let empty = PlayerInput::from_ordered_edges(9, vec![]).unwrap();
        let err = run_protocol(&[&Babbler], &[empty], 9, 64, None).unwrap_err();
        assert!(matches!(err, Error::BudgetViolation { .. }));
    }

    #[test]
    fn player_count_must_match_input_count() {
        let alg = ClaimAll::new(5).unwrap();
        let players = streaming_players(&alg, 2, 64).unwrap();
        let refs: Vec<&dyn Player> = players.iter().map(|p| p as &dyn Player).collect();
        let one = vec![PlayerInput::from_ordered_edges(5, vec![]).unwrap()];
        assert!(run_protocol(&refs, &one, 5, 64, None).is_err());
    }
}
