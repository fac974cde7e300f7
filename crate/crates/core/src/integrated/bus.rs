//! In-process publish/subscribe topic bus with per-topic FIFO delivery,
//! standing in for the vehicle's middleware.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::domain::ComponentState;

/// Control commands for the vehicle simulator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ControlCommand {
    Stop,
    FollowTrajectory,
}

/// A command with the simulated time it was issued. A stop stays in force
/// until a newer control message arrives.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ControlMessage {
    pub command: ControlCommand,
    pub timestamp: f64,
}

/// Everything that travels over the bus.
#[derive(Debug, Clone, PartialEq)]
pub enum BusMessage {
    ComponentState {
        component: usize,
        state: ComponentState,
    },
    Control(ControlMessage),
}

/// A reader's position in one topic's log. Subscribers receive every
/// message published after they subscribed, in publish order.
#[derive(Debug, Clone)]
pub struct Subscription {
    topic: String,
    cursor: usize,
}

impl Subscription {
    pub fn topic(&self) -> &str {
        &self.topic
    }
}

/// Named topics, each an append-only message log. Publishing is atomic
/// (the bus is driven by one scheduler) and topics auto-create.
#[derive(Debug, Default)]
pub struct TopicBus {
    topics: BTreeMap<String, Vec<BusMessage>>,
}

impl TopicBus {
    pub fn new() -> Self {
        TopicBus::default()
    }

    pub fn publish(&mut self, topic: &str, message: BusMessage) {
        self.topics.entry(topic.to_string()).or_default().push(message);
    }

    /// Starts reading `topic` from this point on; prior messages are not
    /// delivered.
    pub fn subscribe(&mut self, topic: &str) -> Subscription {
        let log = self.topics.entry(topic.to_string()).or_default();
        Subscription {
            topic: topic.to_string(),
            cursor: log.len(),
        }
    }

    /// All messages published to the subscription's topic since the last
    /// poll, advancing the cursor past them.
    pub fn poll<'a>(&'a self, sub: &mut Subscription) -> &'a [BusMessage] {
        let Some(log) = self.topics.get(&sub.topic) else {
            return &[];
        };
        let from = sub.cursor.min(log.len());
        sub.cursor = log.len();
        &log[from..]
    }

    /// Complete history of a topic.
    pub fn log(&self, topic: &str) -> &[BusMessage] {
        self.topics.get(topic).map(Vec::as_slice).unwrap_or(&[])
    }
}
