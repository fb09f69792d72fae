//! Intent types and the parsers for bot replies.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::scene::NodeId;

use super::RouterError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Intent {
    Pilot,
    CuttingPlane,
    Explorer,
    Encyclopedia,
    Guardian,
}

impl Intent {
    pub const ALL: [Intent; 5] = [
        Intent::Pilot,
        Intent::CuttingPlane,
        Intent::Explorer,
        Intent::Encyclopedia,
        Intent::Guardian,
    ];

    /// The label the manager bot answers with.
    pub fn label(self) -> &'static str {
        match self {
            Intent::Pilot => "Pilot",
            Intent::CuttingPlane => "Cutting Plane",
            Intent::Explorer => "Explorer",
            Intent::Encyclopedia => "Encyclopedia",
            Intent::Guardian => "Guardian",
        }
    }
}

impl fmt::Display for Intent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Accepts the label with any casing, surrounding punctuation, and with the
/// words of "Cutting Plane" joined by nothing, a space, `_` or `-`.
impl FromStr for Intent {
    type Err = RouterError;

    fn from_str(reply: &str) -> Result<Self, Self::Err> {
        let key: String = reply
            .trim()
            .trim_matches(|c: char| !c.is_alphanumeric())
            .chars()
            .filter(|c| !matches!(c, ' ' | '_' | '-'))
            .flat_map(char::to_lowercase)
            .collect();
        match key.as_str() {
            "pilot" => Ok(Intent::Pilot),
            "cuttingplane" => Ok(Intent::CuttingPlane),
            "explorer" => Ok(Intent::Explorer),
            "encyclopedia" => Ok(Intent::Encyclopedia),
            "guardian" => Ok(Intent::Guardian),
            _ => Err(RouterError::UnparseableReply(reply.to_owned())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScaleDirection {
    Up,
    Down,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum PilotIntent {
    NodeNavigation(NodeId),
    ScaleChange(ScaleDirection),
    Reset,
    ReturnBack,
}

/// Pilot command class as returned by the pilot bot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PilotCommand {
    NodeNavigation,
    ScaleChange(Option<ScaleDirection>),
    Reset,
    ReturnBack,
}

/// Parses a pilot reply: one digit 1 to 4 (1 node navigation, 2 scale change,
/// 3 reset, 4 return back). A scale change may carry `up` or `down`.
pub fn parse_pilot_reply(reply: &str) -> Result<PilotCommand, RouterError> {
    let bad = || RouterError::UnparseableReply(reply.to_owned());
    let trimmed = reply.trim().trim_end_matches('.');
    let mut parts = trimmed.split_whitespace();
    let digit = parts.next().ok_or_else(bad)?;
    let rest: Vec<&str> = parts.collect();
    let command = match digit {
        "1" => PilotCommand::NodeNavigation,
        "2" => {
            let direction = match rest.as_slice() {
                [] => None,
                [d] if d.eq_ignore_ascii_case("up") => Some(ScaleDirection::Up),
                [d] if d.eq_ignore_ascii_case("down") => Some(ScaleDirection::Down),
                _ => return Err(bad()),
            };
            return Ok(PilotCommand::ScaleChange(direction));
        }
        "3" => PilotCommand::Reset,
        "4" => PilotCommand::ReturnBack,
        _ => return Err(bad()),
    };
    if rest.is_empty() {
        Ok(command)
    } else {
        Err(bad())
    }
}

/// Zoom and orbit request, `{zoom, yaw, pitch, roll}` with angles in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Transform {
    pub zoom_factor: f64,
    pub yaw: f64,
    pub pitch: f64,
    pub roll: f64,
}

impl Default for Transform {
    fn default() -> Self {
        Self::IDENTITY
    }
}

impl Transform {
    pub const IDENTITY: Transform = Transform {
        zoom_factor: 1.0,
        yaw: 0.0,
        pitch: 0.0,
        roll: 0.0,
    };

    pub fn new(zoom_factor: f64, yaw: f64, pitch: f64, roll: f64) -> Result<Self, RouterError> {
        let t = Self {
            zoom_factor,
            yaw,
            pitch,
            roll,
        };
        if ![zoom_factor, yaw, pitch, roll]
            .iter()
            .all(|v| v.is_finite())
        {
            return Err(RouterError::MalformedTransform(t.to_string()));
        }
        if zoom_factor <= 0.0 {
            return Err(RouterError::NonPositiveZoom(zoom_factor));
        }
        Ok(t)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    /// Spoken description of the move, e.g. "to the right and closer".
    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        if self.yaw > 0.0 {
            parts.push("to the right");
        } else if self.yaw < 0.0 {
            parts.push("to the left");
        }
        if self.pitch > 0.0 {
            parts.push("from above");
        } else if self.pitch < 0.0 {
            parts.push("from below");
        }
        if self.roll != 0.0 {
            parts.push("with a tilt");
        }
        if self.zoom_factor > 1.0 {
            parts.push("closer");
        } else if self.zoom_factor < 1.0 {
            parts.push("further away");
        }
        if parts.is_empty() {
            "as it is".to_owned()
        } else {
            parts.join(" and ")
        }
    }
}

impl fmt::Display for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{{{},{},{},{}}}",
            self.zoom_factor, self.yaw, self.pitch, self.roll
        )
    }
}

impl FromStr for Transform {
    type Err = RouterError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_transform(s)
    }
}

/// Parses the explorer reply. The first `{...}` group must hold exactly four
/// comma-separated numbers; whitespace anywhere is ignored.
pub fn parse_transform(reply: &str) -> Result<Transform, RouterError> {
    let bad = || RouterError::MalformedTransform(reply.to_owned());
    let open = reply.find('{').ok_or_else(bad)?;
    let close = open + reply[open..].find('}').ok_or_else(bad)?;
    let fields = reply[open + 1..close]
        .split(',')
        .map(|f| f.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<Vec<_>, _>>()?;
    let [zoom, yaw, pitch, roll] = fields[..] else {
        return Err(bad());
    };
    if ![zoom, yaw, pitch, roll].iter().all(|v| v.is_finite()) {
        return Err(bad());
    }
    Transform::new(zoom, yaw, pitch, roll)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncyclopediaAnswer {
    pub concise: String,
    pub detailed: String,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn intent_labels() {
        for intent in Intent::ALL {
            assert_eq!(intent.label().parse::<Intent>().unwrap(), intent);
        }
        assert_eq!(
            "cutting_plane".parse::<Intent>().unwrap(),
            Intent::CuttingPlane
        );
        assert_eq!(" pilot.\n".parse::<Intent>().unwrap(), Intent::Pilot);
        assert!("Navigator".parse::<Intent>().is_err());
    }

    #[test]
    fn pilot_digits() {
        assert_eq!(
            parse_pilot_reply("1").unwrap(),
            PilotCommand::NodeNavigation
        );
        assert_eq!(
            parse_pilot_reply("2 down").unwrap(),
            PilotCommand::ScaleChange(Some(ScaleDirection::Down))
        );
        assert_eq!(
            parse_pilot_reply("2").unwrap(),
            PilotCommand::ScaleChange(None)
        );
        assert_eq!(parse_pilot_reply(" 3\n").unwrap(), PilotCommand::Reset);
        assert_eq!(parse_pilot_reply("4.").unwrap(), PilotCommand::ReturnBack);
        for bad in ["", "0", "5", "12", "one", "1 up", "2 sideways"] {
            assert!(parse_pilot_reply(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn transforms() {
        assert_eq!(
            parse_transform("{1,90,0,0}").unwrap(),
            Transform::new(1.0, 90.0, 0.0, 0.0).unwrap()
        );
        assert_eq!(
            parse_transform("  { 2 , 0,0 ,\t0 } ").unwrap(),
            Transform::new(2.0, 0.0, 0.0, 0.0).unwrap()
        );
        assert!(parse_transform("{1,0,0,0}").unwrap().is_identity());
        assert!(matches!(
            parse_transform("{0,0,0,0}"),
            Err(RouterError::NonPositiveZoom(_))
        ));
        for bad in [
            "1,0,0,0",
            "{1,0,0}",
            "{1,0,0,0,0}",
            "{a,0,0,0}",
            "{1,inf,0,0}",
            "{1,0,0,0",
        ] {
            assert!(
                matches!(
                    parse_transform(bad),
                    Err(RouterError::MalformedTransform(_))
                ),
                "{bad}"
            );
        }
    }

    #[test]
    fn transform_display() {
        let t = Transform::new(0.5, -45.0, 12.25, 0.0).unwrap();
        assert_eq!(t.to_string(), "{0.5,-45,12.25,0}");
        assert_eq!(parse_transform(&t.to_string()).unwrap(), t);
    }
}
