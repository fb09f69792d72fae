//! Conversational exploration of hierarchical 3D scenes.
//!
//! A query is classified by a manager bot and handed to one of the role bots
//! ([`router`]). Their replies become camera moves on a headless
//! [`visual::VisualState`] or, for knowledge questions, an interactive
//! flythrough over the nodes the answer mentions ([`narrative`]). Everything
//! a visitor sees is a queue of [`narrative::Scene`]s held by a
//! [`session::Session`].

pub mod narrative;
pub mod router;
pub mod scene;
pub mod session;
pub mod visual;
