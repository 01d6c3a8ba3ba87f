"""Engine and sessions for the result store named by DATABASE_URL"""

from contextlib import contextmanager
from typing import Generator
from sqlalchemy import Engine, create_engine
from sqlalchemy.orm import Session, sessionmaker
from sqlalchemy_utils import create_database, database_exists
from database.models import Base
from qisim.settings import settings

DATABASE_URL = settings.database_url


def make_engine(url: str, echo: bool = False) -> Engine:
    """Engine for ``url``; sqlite connections may be shared with API worker threads"""
    connect_args = {"check_same_thread": False} if url.startswith("sqlite") else {}
    return create_engine(url, echo=echo, connect_args=connect_args)


engine = make_engine(DATABASE_URL, echo=settings.sql_echo)
SessionLocal = sessionmaker(autocommit=False, autoflush=False, bind=engine)


def create_db() -> None:
    if not database_exists(engine.url):
        create_database(engine.url)


def create_schema() -> None:
    Base.metadata.create_all(engine)


# FastAPI dependency
def get_db_session() -> Generator[Session, None, None]:
    session = SessionLocal()
    try:
        yield session
        session.commit()
    except Exception:
        session.rollback()
        raise
    finally:
        session.close()


@contextmanager
def get_db_context() -> Generator[Session, None, None]:
    """Session for the CLI; creates the database and schema on first use"""
    create_db()
    create_schema()
    with SessionLocal() as session:
        try:
            yield session
            session.commit()
        except Exception:
            session.rollback()
            raise
