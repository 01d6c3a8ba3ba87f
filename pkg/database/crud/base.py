from typing import Any, Generic, Iterable, Type, TypeVar
from sqlalchemy import func, select
from sqlalchemy.orm import Session
from database.models import BaseModel

ORMModel = TypeVar("ORMModel", bound=BaseModel)


class CRUDRepository(Generic[ORMModel]):
    """Generic create/read/update/delete over one declarative model"""

    def __init__(self, model: Type[ORMModel], db_session: Session) -> None:
        self.db_session = db_session
        self.model = model

    def _select(self, *args, **kwargs):
        sql = select(self.model)
        if args:
            sql = sql.where(*args)
        # Unknown keys are ignored so callers can pass whole payloads
        for key, value in kwargs.items():
            if hasattr(self.model, key):
                sql = sql.where(getattr(self.model, key) == value)
        return sql

    def create(self, **kwargs) -> ORMModel:
        """Creates and commits one row

        Returns:
            ORMModel: The refreshed instance, primary key populated
        """
        model_obj = self.model(**kwargs)
        self.db_session.add(model_obj)
        self.db_session.commit()
        self.db_session.refresh(model_obj)
        return model_obj

    def create_many(self, rows: Iterable[dict[str, Any]]) -> list[ORMModel]:
        """Creates several rows in one commit"""
        model_objs = [self.model(**row) for row in rows]
        self.db_session.add_all(model_objs)
        self.db_session.commit()
        for model_obj in model_objs:
            self.db_session.refresh(model_obj)
        return model_objs

    def get_one(self, *args, **kwargs) -> ORMModel | None:
        """Gets a single instance matching the filters

        Args:
            *args: Filter expression such as SweepPoint.M > 10**7
            **kwargs: Equality filters such as seed=7

        Returns:
            ORMModel | None: None when nothing matches
        """
        return self.db_session.execute(self._select(*args, **kwargs)).scalar_one_or_none()

    def get_all(self, *args, **kwargs) -> list[ORMModel]:
        """Gets every instance matching the filters, ordered by id"""
        sql = self._select(*args, **kwargs).order_by(self.model.id)
        return list(self.db_session.execute(sql).scalars().all())

    def count(self, *args, **kwargs) -> int:
        sql = select(func.count()).select_from(self._select(*args, **kwargs).subquery())
        return int(self.db_session.execute(sql).scalar_one())

    def delete(self, model_instance: ORMModel | None) -> ORMModel | None:
        """Deletes an instance; returns None if nothing was passed"""
        if model_instance:
            self.db_session.delete(model_instance)
            self.db_session.commit()
            return model_instance
        return None

    def update(self, model_instance: ORMModel | None, **update_data) -> ORMModel | None:
        """Sets the given attributes and commits

        Returns:
            ORMModel | None: None if no instance was passed
        """
        if not model_instance:
            return None
        for key, value in update_data.items():
            if hasattr(model_instance, key):
                setattr(model_instance, key, value)
        self.db_session.commit()
        self.db_session.refresh(model_instance)
        return model_instance
