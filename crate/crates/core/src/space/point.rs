use std::fmt;
use std::sync::Arc;

use crate::monads::TElem;

/// A point of some object: a base label, a tuple (products, with the empty
/// tuple as the point of the terminal object), or an element of `TX` viewed
/// as a point of the object `TX`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Point {
    Label(Arc<str>),
    Tuple(Vec<Point>),
    Elem(Box<TElem>),
}

impl Point {
    pub fn label(s: &str) -> Point {
        Point::Label(Arc::from(s))
    }

    pub fn unit() -> Point {
        Point::Tuple(Vec::new())
    }

    pub fn pair(a: Point, b: Point) -> Point {
        Point::Tuple(vec![a, b])
    }

    pub fn elem(t: TElem) -> Point {
        Point::Elem(Box::new(t))
    }

    pub fn as_label(&self) -> Option<&str> {
        match self {
            Point::Label(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_tuple(&self) -> Option<&[Point]> {
        match self {
            Point::Tuple(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_elem(&self) -> Option<&TElem> {
        match self {
            Point::Elem(t) => Some(t),
            _ => None,
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Label(s) => f.write_str(s),
            Point::Tuple(items) => {
                f.write_str("(")?;
                for (i, p) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str(")")
            }
            Point::Elem(t) => write!(f, "{t}"),
        }
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<&str> for Point {
    fn from(s: &str) -> Self {
        Point::label(s)
    }
}
