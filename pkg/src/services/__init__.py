"""Service layer exports."""

from .base_service import BaseService
from .campaign_service import CampaignService, resume, run_campaign
from .experiment_service import ExperimentService, gain_table, run_experiment, timing_report
from .study_service import NewNodeStudy, StudyService, new_node_study
